package com.minimart.user;

import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.RestController;

@RestController
public class UserController {

    @GetMapping("/api/v1/users/{id}")
    public User byId(@PathVariable String id) {
        User user = new User();
        user.setId(id);
        return user;
    }
}
