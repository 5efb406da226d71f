package com.minimart.payment;

import org.springframework.web.bind.annotation.GetMapping;
import org.springframework.web.bind.annotation.PathVariable;
import org.springframework.web.bind.annotation.PostMapping;
import org.springframework.web.bind.annotation.RequestBody;
import org.springframework.web.bind.annotation.RequestMapping;
import org.springframework.web.bind.annotation.RestController;

@RestController
@RequestMapping("/api/v1/payment")
public class PaymentController {

    @PostMapping("/pay")
    public String pay(@RequestBody PaymentRequest request) {
        return "ACCEPTED";
    }

    @GetMapping("/tx/{id}")
    public String transaction(@PathVariable Integer id) {
        return "SETTLED";
    }
}
