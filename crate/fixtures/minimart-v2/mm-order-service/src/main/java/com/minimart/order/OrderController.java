package com.minimart.order;

import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.PostMapping;
import org.springframework.web.bind.annotation.RequestBody;
import org.springframework.web.bind.annotation.RequestMapping;
import org.springframework.web.bind.annotation.RestController;

@RestController
@RequestMapping("/api/v1/orders")
public class OrderController {

    @PostMapping
    public Order create(@RequestBody Order order) {
        return order;
    }

    @GetMapping("/{id}")
    public Order byId(@PathVariable Integer id) {
        Order order = new Order();
        order.setId(id);
        return order;
    }
}
