package com.minimart.payment;

import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.RestController;

@RestController
public class StatusController {

    @GetMapping("/api/v1/status/{component}")
    public String statusFor(@PathVariable String component) {
        return "OK";
    }
}
